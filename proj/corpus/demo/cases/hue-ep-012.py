import requests

http = requests
HEADERS = {'hue-application-key': 'demo-app-key'}


def list_devices():
    resp = http.get('https://hue-bridge.local/clip/v2/resource/devices', headers=HEADERS)
    return resp.json()
