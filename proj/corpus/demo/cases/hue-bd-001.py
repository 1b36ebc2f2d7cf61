import requests

BASE = 'https://hue-bridge.local/clip/v2'
HEADERS = {'hue-application-key': 'demo-app-key'}


def turn_on(light_id):
    url = f'{BASE}/resource/light/{light_id}'
    resp = requests.put(url, headers=HEADERS, json={'on': {'on': True}})
    return resp.json()
