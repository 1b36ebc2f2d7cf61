import requests

HEADERS = {'hue-application-key': 'demo-app-key'}


def list_everything():
    resp = requests.get('https://hue-bridge.local/clip/v2/resource/device', headers=HEADERS)
    return resp.json()
